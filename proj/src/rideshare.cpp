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
#include "dfo/rideshare.hpp"

#include <Eigen/Eigenvalues>
#include <fstream>
#include <random>
#include <sstream>

#include "dfo/estimation.hpp"
#include "dfo/json_io.hpp"
#include "dfo/linalg.hpp"
#include "dfo/signal_io.hpp"

namespace dfo {

void validate_graph(const RegionGraph& g) {
    if (g.n < 2) throw ConfigError("region graph needs at least 2 regions");
    const auto square = [&](const Eigen::MatrixXd& M, const char* name) {
        if (M.rows() != g.n || M.cols() != g.n)
            throw ConfigError(std::string("graph matrix ") + name + " is " +
                              std::to_string(M.rows()) + "x" +
                              std::to_string(M.cols()) + ", expected " +
                              std::to_string(g.n) + "x" + std::to_string(g.n));
    };
    square(g.a, "a");
    square(g.c, "c");
    square(g.p_max, "p_max");
    square(g.theta, "theta");
    if (g.max_travel_slots < 1)
        throw ConfigError("max_travel_slots must be >= 1");
    for (int i = 0; i < g.n; ++i) {
        if (g.a(i, i) != 0.0)
            throw ConfigError("rebalancing fraction a(" + std::to_string(i) +
                              "," + std::to_string(i) + ") must be zero");
        if (g.a.row(i).minCoeff() < 0.0)
            throw ConfigError("rebalancing fractions must be nonnegative");
        if (g.a.row(i).sum() > 1.0 + 1e-12)
            throw ConfigError("rebalancing outflow of region " +
                              std::to_string(i + 1) + " exceeds one");
        for (int j = 0; j < g.n; ++j) {
            if (i == j) continue;
            if (g.c(i, j) <= 0.0)
                throw ConfigError("routing cost c(" + std::to_string(i + 1) +
                                  "," + std::to_string(j + 1) +
                                  ") must be positive");
            if (g.p_max(i, j) <= 0.0)
                throw ConfigError("price cap p_max(" + std::to_string(i + 1) +
                                  "," + std::to_string(j + 1) +
                                  ") must be positive");
            if (g.theta(i, j) < 0.0 || g.theta(i, j) > 1.0)
                throw ConfigError("elasticity theta(" + std::to_string(i + 1) +
                                  "," + std::to_string(j + 1) +
                                  ") must lie in [0, 1]");
        }
    }
}

RegionGraph make_chain_graph(int n, double a, double cost, double p_max,
                             double theta, int max_travel_slots) {
    RegionGraph g;
    g.n = n;
    g.a = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) {
        g.a(i, i + 1) = a;
        g.a(i + 1, i) = a;
    }
    g.c = Eigen::MatrixXd::Constant(n, n, cost);
    g.p_max = Eigen::MatrixXd::Constant(n, n, p_max);
    g.theta = Eigen::MatrixXd::Constant(n, n, theta);
    g.max_travel_slots = max_travel_slots;
    validate_graph(g);
    return g;
}

int pair_index(int n, int origin, int dest) {
    if (origin < 0 || origin >= n || dest < 0 || dest >= n || origin == dest)
        throw DimensionError("invalid region pair (" + std::to_string(origin) +
                             "," + std::to_string(dest) + ")");
    return origin * (n - 1) + (dest < origin ? dest : dest - 1);
}

std::pair<int, int> pair_origin_dest(int n, int index) {
    if (index < 0 || index >= n * (n - 1))
        throw DimensionError("pair index out of range");
    const int origin = index / (n - 1);
    int dest = index % (n - 1);
    if (dest >= origin) ++dest;
    return {origin, dest};
}

Eigen::VectorXd flatten_pairs(const Eigen::MatrixXd& M, int n) {
    Eigen::VectorXd v(n * (n - 1));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) v(pair_index(n, i, j)) = M(i, j);
    return v;
}

Eigen::MatrixXd unflatten_pairs(const Eigen::VectorXd& v, int n) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n * (n - 1); ++k) {
        const auto [i, j] = pair_origin_dest(n, k);
        M(i, j) = v(k);
    }
    return M;
}

DemandProfile synthetic_two_peak_demand(int n_regions, int slots,
                                        double peak_total, uint64_t seed) {
    if (n_regions < 2 || slots < 1 || peak_total <= 0.0)
        throw ConfigError("invalid synthetic demand parameters");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> weight(0.5, 1.5);
    Eigen::MatrixXd base = Eigen::MatrixXd::Zero(n_regions, n_regions);
    double base_total = 0.0;
    for (int i = 0; i < n_regions; ++i)
        for (int j = 0; j < n_regions; ++j) {
            if (i == j) continue;
            base(i, j) = weight(rng);
            base_total += base(i, j);
        }
    base /= base_total;

    // Morning and evening bumps over a 6:00-21:00 day, plus a floor.
    const double k1 = slots * (2.0 / 15.0);   // ~8:00
    const double k2 = slots * (12.0 / 15.0);  // ~18:00
    const double width = slots / 15.0;        // ~1 hour
    const double floor = 0.15;

    std::vector<double> profile(slots);
    double peak = 0.0;
    for (int k = 0; k < slots; ++k) {
        const double b1 = std::exp(-0.5 * std::pow((k - k1) / width, 2));
        const double b2 = std::exp(-0.5 * std::pow((k - k2) / width, 2));
        profile[k] = floor + b1 + b2;
        peak = std::max(peak, profile[k]);
    }

    DemandProfile demand;
    demand.delta.reserve(slots);
    for (int k = 0; k < slots; ++k)
        demand.delta.push_back(base * (peak_total * profile[k] / peak));
    return demand;
}

DemandProfile read_demand_csv(const std::string& path, int n_regions) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open demand file: " + path);
    std::string line;
    if (!std::getline(in, line))
        throw ConfigError(path + ": line 1: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "slot,origin,dest,delta")
        throw ConfigError(path +
                          ": line 1: header must be slot,origin,dest,delta");

    std::vector<Eigen::MatrixXd> slots;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ss(line);
        long slot, origin, dest;
        double delta;
        char c1, c2, c3;
        if (!(ss >> slot >> c1 >> origin >> c2 >> dest >> c3 >> delta) ||
            c1 != ',' || c2 != ',' || c3 != ',')
            throw ConfigError(path + ": line " + std::to_string(line_no) +
                              ": cannot parse record");
        if (slot < 0 || origin < 1 || origin > n_regions || dest < 1 ||
            dest > n_regions || origin == dest || delta < 0.0)
            throw ConfigError(path + ": line " + std::to_string(line_no) +
                              ": record out of range");
        if (static_cast<long>(slots.size()) <= slot)
            slots.resize(slot + 1,
                         Eigen::MatrixXd::Zero(n_regions, n_regions));
        slots[slot](origin - 1, dest - 1) = delta;
    }
    if (slots.empty()) throw ConfigError(path + ": no demand records");
    DemandProfile demand;
    demand.delta = std::move(slots);
    return demand;
}

void write_demand_csv(const std::string& path, const DemandProfile& demand,
                      int n_regions) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write demand file: " + path);
    out << "slot,origin,dest,delta\n";
    for (int k = 0; k < demand.slots(); ++k)
        for (int i = 0; i < n_regions; ++i)
            for (int j = 0; j < n_regions; ++j) {
                if (i == j || demand.delta[k](i, j) == 0.0) continue;
                out << k << "," << (i + 1) << "," << (j + 1) << ","
                    << format_double(demand.delta[k](i, j)) << "\n";
            }
}

RegionGraph graph_from_json(const nlohmann::json& j) {
    for (const char* field : {"a", "c", "p_max", "theta"})
        if (!j.contains(field))
            throw ConfigError(std::string("graph document missing field '") +
                              field + "'");
    RegionGraph g;
    g.a = matrix_from_json(j["a"], "a");
    g.c = matrix_from_json(j["c"], "c");
    g.p_max = matrix_from_json(j["p_max"], "p_max");
    g.theta = matrix_from_json(j["theta"], "theta");
    g.n = static_cast<int>(g.a.rows());
    if (j.contains("max_travel_slots"))
        g.max_travel_slots = j["max_travel_slots"].get<int>();
    validate_graph(g);
    return g;
}

nlohmann::json graph_to_json(const RegionGraph& g) {
    return {{"a", matrix_to_json(g.a)},
            {"c", matrix_to_json(g.c)},
            {"p_max", matrix_to_json(g.p_max)},
            {"theta", matrix_to_json(g.theta)},
            {"max_travel_slots", g.max_travel_slots}};
}

double accepted_demand(double delta, double theta, double p, double p_max) {
    if (delta < 0.0) throw ConfigError("potential demand must be >= 0");
    if (theta < 0.0 || theta > 1.0)
        throw ConfigError("theta must lie in [0, 1]");
    if (p < 0.0 || p > p_max + 1e-12)
        throw ConfigError("price " + std::to_string(p) +
                          " outside [0, p_max = " + std::to_string(p_max) +
                          "]");
    return std::max(0.0, delta * (1.0 - theta * p / p_max));
}

Eigen::MatrixXd accepted_demand(const RegionGraph& g,
                                const Eigen::MatrixXd& delta,
                                const Eigen::MatrixXd& prices) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(g.n, g.n);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            if (i == j) continue;
            d(i, j) = accepted_demand(delta(i, j), g.theta(i, j),
                                      prices(i, j), g.p_max(i, j));
        }
    return d;
}

double FleetState::total_mass() const {
    double mass = idle.sum();
    for (const TransitEntry& e : in_transit) mass += e.volume;
    return mass;
}

FleetState initial_fleet_state(const Eigen::VectorXd& idle) {
    if (idle.size() == 0) throw DimensionError("initial idle vector is empty");
    if (idle.minCoeff() < 0.0)
        throw ConfigError("initial idle occupancy must be nonnegative");
    FleetState s;
    s.idle = idle;
    return s;
}

FleetStepResult fleet_step(const FleetState& state, const RegionGraph& g,
                           const Eigen::MatrixXd& demand,
                           const Eigen::MatrixXi& travel_slots,
                           const Eigen::VectorXd& e) {
    if (state.idle.size() != g.n)
        throw DimensionError("fleet state has " +
                             std::to_string(state.idle.size()) +
                             " regions, graph has " + std::to_string(g.n));
    if (demand.rows() != g.n || demand.cols() != g.n)
        throw DimensionError("demand matrix dimension mismatch");
    if (travel_slots.rows() != g.n || travel_slots.cols() != g.n)
        throw DimensionError("travel time matrix dimension mismatch");
    if (e.size() != g.n) throw DimensionError("disturbance vector mismatch");
    if (demand.minCoeff() < -1e-15)
        throw ConfigError("accepted demand must be nonnegative");
    for (int i = 0; i < g.n; ++i)
        if (demand(i, i) != 0.0)
            throw ConfigError("demand diagonal must be zero");

    FleetStepResult res;
    res.next = state;
    res.next.step = state.step + 1;
    res.served = Eigen::MatrixXd::Zero(g.n, g.n);

    // Rebalancing fractions act on the whole idle pool; service capacity is
    // the remainder. Demand above capacity is served proportionally.
    Eigen::VectorXd out_rebalance = Eigen::VectorXd::Zero(g.n);
    Eigen::VectorXd in_rebalance = Eigen::VectorXd::Zero(g.n);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            if (i == j) continue;
            const double flow = g.a(i, j) * state.idle(i);
            out_rebalance(i) += flow;
            in_rebalance(j) += flow;
        }

    res.next.in_transit.clear();
    Eigen::VectorXd arrivals = Eigen::VectorXd::Zero(g.n);
    for (const FleetState::TransitEntry& entry : state.in_transit) {
        if (entry.arrival_step <= state.step)
            arrivals(entry.dest) += entry.volume;
        else
            res.next.in_transit.push_back(entry);
    }

    Eigen::VectorXd departures = Eigen::VectorXd::Zero(g.n);
    for (int i = 0; i < g.n; ++i) {
        const double capacity = state.idle(i) - out_rebalance(i);
        const double wanted = demand.row(i).sum();
        double scale = 1.0;
        if (wanted > capacity) {
            scale = capacity > 0.0 ? capacity / wanted : 0.0;
            res.shortfall += wanted - scale * wanted;
        }
        for (int j = 0; j < g.n; ++j) {
            if (i == j || demand(i, j) <= 0.0) continue;
            const double vol = scale * demand(i, j);
            if (vol <= 0.0) continue;
            const int tau = travel_slots(i, j);
            if (tau < 1 || tau > g.max_travel_slots)
                throw ConfigError(
                    "travel time " + std::to_string(tau) + " for pair (" +
                    std::to_string(i + 1) + "," + std::to_string(j + 1) +
                    ") outside [1, " + std::to_string(g.max_travel_slots) +
                    "]");
            res.served(i, j) = vol;
            departures(i) += vol;
            res.next.in_transit.push_back({j, state.step + tau, vol});
        }
    }

    res.next.idle = state.idle - out_rebalance + in_rebalance - departures +
                    arrivals + e;
    for (int i = 0; i < g.n; ++i) {
        if (res.next.idle(i) < 0.0) {
            res.clipped += -res.next.idle(i);
            res.next.idle(i) = 0.0;
        }
    }
    return res;
}

ReducedModel reduced_system(const RegionGraph& g) {
    validate_graph(g);
    const int n = g.n;

    Eigen::MatrixXd rebalance = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        rebalance(i, i) = 1.0 - g.a.row(i).sum();
        for (int j = 0; j < n; ++j)
            if (i != j) rebalance(i, j) = g.a(j, i);
    }

    Eigen::MatrixXd diff_map = Eigen::MatrixXd::Zero(n - 1, n);
    for (int i = 0; i < n - 1; ++i) {
        diff_map(i, i) = 1.0;
        diff_map(i, i + 1) = -1.0;
    }

    // Right inverse of the difference map with zero-mass columns: together
    // with the conserved total, differences determine the levels exactly.
    Eigen::MatrixXd basis(n, n);
    basis.topRows(n - 1) = diff_map;
    basis.row(n - 1).setOnes();
    const Eigen::MatrixXd lift_map = basis.inverse().leftCols(n - 1);

    const Eigen::MatrixXd A_red = diff_map * rebalance * lift_map;
    const double rho = Eigen::EigenSolver<Eigen::MatrixXd>(A_red, false)
                           .eigenvalues()
                           .cwiseAbs()
                           .maxCoeff();
    if (!(rho < 1.0))
        throw SystemPropertyError(
            "reduced occupancy dynamics are not Schur (spectral radius " +
            std::to_string(rho) +
            "); the rebalancing graph does not mix all regions");

    Eigen::MatrixXd departures = Eigen::MatrixXd::Zero(n, g.pair_count());
    for (int k = 0; k < g.pair_count(); ++k)
        departures(pair_origin_dest(n, k).first, k) = 1.0;

    return ReducedModel{
        LtiSystem(A_red, -diff_map * departures,
                  Eigen::MatrixXd::Identity(n - 1, n - 1),
                  Eigen::MatrixXd::Zero(n - 1, n), diff_map),
        diff_map, lift_map, departures, rebalance};
}

PricingCost build_pricing_cost(const RegionGraph& g,
                               const Eigen::MatrixXd& delta, double rho,
                               const Eigen::MatrixXd& lift_map,
                               double eps_mu) {
    if (rho < 0.0) throw ConfigError("rho must be >= 0");
    if (delta.rows() != g.n || delta.cols() != g.n)
        throw DimensionError("demand matrix dimension mismatch");
    const int n_pairs = g.pair_count();
    const int n_diff = g.n - 1;
    if (lift_map.rows() != g.n || lift_map.cols() != n_diff)
        throw DimensionError("lift map dimension mismatch");

    PricingCost pc;
    pc.base_demand = flatten_pairs(delta, g.n);
    const Eigen::VectorXd theta = flatten_pairs(g.theta, g.n);
    const Eigen::VectorXd p_max = flatten_pairs(g.p_max, g.n);
    const Eigen::VectorXd costs = flatten_pairs(g.c, g.n);
    pc.elasticity = pc.base_demand.cwiseProduct(theta).cwiseQuotient(p_max);

    pc.regularization = Eigen::VectorXd::Zero(n_pairs);
    for (int k = 0; k < n_pairs; ++k)
        if (2.0 * pc.elasticity(k) < eps_mu) {
            pc.regularization(k) = eps_mu;
            ++pc.degenerate_count;
        }

    const Eigen::MatrixXd penalty = 2.0 * rho *
                                    (lift_map.transpose() * lift_map);
    const Eigen::VectorXd d0 = pc.base_demand;
    const Eigen::VectorXd lam = pc.elasticity;
    const Eigen::VectorXd eps = pc.regularization;

    CostModel& cost = pc.cost;
    cost.u_dim = n_pairs;
    cost.y_dim = n_diff;
    cost.mu = (2.0 * lam + eps).minCoeff();
    cost.ell_grad_u = (2.0 * lam + eps).maxCoeff();
    cost.ell_grad_y = spectral_norm(penalty);
    // Occupancy differences live in [-1, 1] per coordinate.
    cost.y_box_lo = Eigen::VectorXd::Constant(n_diff, -1.0);
    cost.y_box_hi = Eigen::VectorXd::Constant(n_diff, 1.0);
    cost.ell = cost.ell_grad_y * std::sqrt(static_cast<double>(n_diff));

    const Eigen::MatrixXd lift = lift_map;
    cost.value = [d0, lam, eps, costs, lift, rho](
                     const Eigen::VectorXd& p, const Eigen::VectorXd& y,
                     int) {
        const Eigen::VectorXd d = d0 - lam.cwiseProduct(p);
        const double profit = (p - costs).dot(d);
        return -profit + rho * (lift * y).squaredNorm() +
               0.5 * eps.cwiseProduct(p).dot(p);
    };
    cost.grad_u = [d0, lam, eps, costs](const Eigen::VectorXd& p,
                                        const Eigen::VectorXd&,
                                        int) -> Eigen::VectorXd {
        return 2.0 * lam.cwiseProduct(p) - d0 - lam.cwiseProduct(costs) +
               eps.cwiseProduct(p);
    };
    cost.grad_y = [penalty](const Eigen::VectorXd&, const Eigen::VectorXd& y,
                            int) -> Eigen::VectorXd { return penalty * y; };

    pc.price_box = ConvexSet::box(Eigen::VectorXd::Zero(n_pairs), p_max);
    return pc;
}

namespace {

struct SeedDraws {
    std::vector<Eigen::MatrixXd> demand_factor;  // per slot, n x n
    std::vector<Eigen::MatrixXi> travel;         // per slot, n x n
    std::vector<Eigen::VectorXd> exo;            // per slot, n
};

SeedDraws draw_seed_noise(const RideshareScenario& sc, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_int_distribution<int> travel(1, sc.graph.max_travel_slots);
    const int n = sc.graph.n;
    const int slots = sc.demand.slots();

    SeedDraws draws;
    draws.demand_factor.reserve(slots);
    draws.travel.reserve(slots);
    draws.exo.reserve(slots);
    for (int k = 0; k < slots; ++k) {
        Eigen::MatrixXd f(n, n);
        Eigen::MatrixXi tr(n, n);
        Eigen::VectorXd e(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                f(i, j) = std::max(0.0, 1.0 + sc.demand_noise * unit(rng));
                tr(i, j) = travel(rng);
            }
            e(i) = sc.service_noise * unit(rng);
        }
        draws.demand_factor.push_back(std::move(f));
        draws.travel.push_back(std::move(tr));
        draws.exo.push_back(std::move(e));
    }
    return draws;
}

Eigen::MatrixXd train_demand_gain(const RideshareScenario& sc,
                                  const ReducedModel& red) {
    const int n = sc.graph.n;
    const int n_pairs = sc.graph.pair_count();
    const int n_diff = n - 1;
    int T = sc.training_slots;
    if (T <= 0) T = default_training_length(n_pairs, n, n_diff, 1);

    Eigen::MatrixXd mean_delta = Eigen::MatrixXd::Zero(n, n);
    for (const auto& d : sc.demand.delta) mean_delta += d;
    mean_delta *= sc.training_demand_scale / sc.demand.slots();

    std::mt19937_64 rng(sc.training_seed);
    std::uniform_real_distribution<double> price_frac(0.5, 1.0);
    std::uniform_int_distribution<int> travel(1, sc.graph.max_travel_slots);

    Signal u_sig(n_pairs, T);
    Signal y_sig(n_diff, T + 1);
    FleetState state = initial_fleet_state(sc.initial_idle);
    const Eigen::VectorXd zero_e = Eigen::VectorXd::Zero(n);

    for (int k = 0; k < T; ++k) {
        y_sig.col(k) = red.diff_map * state.idle;
        Eigen::MatrixXd prices(n, n);
        Eigen::MatrixXi tr(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                prices(i, j) = price_frac(rng) * sc.graph.p_max(i, j);
                tr(i, j) = travel(rng);
            }
        const Eigen::MatrixXd d = accepted_demand(sc.graph, mean_delta, prices);
        FleetStepResult step = fleet_step(state, sc.graph, d, tr, zero_e);
        // The recorded input is what was actually dispatched, which is the
        // true input of the occupancy dynamics even if rationing kicked in.
        u_sig.col(k) = flatten_pairs(step.served, n);
        state = std::move(step.next);
    }
    y_sig.col(T) = red.diff_map * state.idle;

    EstimationOptions opt;
    opt.nu = 1;
    opt.state_dim = n_diff;
    return estimate_transfer_min_norm(u_sig, y_sig, opt).G_hat;
}

Eigen::MatrixXd fixed_markup_prices(const RegionGraph& g, double markup) {
    Eigen::MatrixXd p = ((1.0 + markup) * g.c).cwiseMin(g.p_max);
    p.diagonal().setZero();
    return p;
}

struct SlotAccumulator {
    std::vector<SlotMetrics> totals;

    explicit SlotAccumulator(int slots) : totals(slots) {
        for (int k = 0; k < slots; ++k) totals[k].slot = k;
    }

    void add(int k, double accepted, double profit, double mean_price,
             double utilization) {
        totals[k].accepted += accepted;
        totals[k].profit += profit;
        totals[k].mean_price += mean_price;
        totals[k].utilization += utilization;
    }

    void finalize(int n_seeds) {
        for (auto& t : totals) {
            t.accepted /= n_seeds;
            t.profit /= n_seeds;
            t.mean_price /= n_seeds;
            t.utilization /= n_seeds;
        }
    }
};

}  // namespace

PolicyComparison run_policy_comparison(const RideshareScenario& sc,
                                       int n_seeds, uint64_t seed) {
    validate_graph(sc.graph);
    if (sc.demand.slots() < 1) throw ConfigError("demand profile is empty");
    if (n_seeds < 1) throw ConfigError("need at least one seed");
    if (sc.initial_idle.size() != sc.graph.n)
        throw DimensionError("initial idle vector dimension mismatch");

    const int n = sc.graph.n;
    const int slots = sc.demand.slots();
    const ReducedModel red = reduced_system(sc.graph);

    PolicyComparison cmp;
    cmp.G_hat_demand = train_demand_gain(sc, red);

    // Curvature-safe default gain: one over the worst-case composite
    // gradient Lipschitz constant across the day.
    double eta = sc.eta;
    if (eta <= 0.0) {
        double ell_hat_max = 0.0;
        const double g_norm = spectral_norm(cmp.G_hat_demand);
        const double ell_grad_y =
            spectral_norm(2.0 * sc.rho *
                          (red.lift_map.transpose() * red.lift_map));
        for (const auto& delta : sc.demand.delta) {
            const Eigen::VectorXd lam =
                flatten_pairs(delta, n)
                    .cwiseProduct(flatten_pairs(sc.graph.theta, n))
                    .cwiseQuotient(flatten_pairs(sc.graph.p_max, n));
            const double ell_u = 2.0 * lam.maxCoeff() + 1e-6;
            const double g_hat_p = g_norm * lam.maxCoeff();
            ell_hat_max =
                std::max(ell_hat_max, ell_u + g_hat_p * ell_grad_y);
        }
        eta = 1.0 / std::max(ell_hat_max, 1e-9);
    }
    cmp.eta_used = eta;

    SlotAccumulator adaptive_acc(slots);
    SlotAccumulator fixed_acc(slots);
    const Eigen::MatrixXd p_fixed = fixed_markup_prices(sc.graph, sc.markup);
    const Eigen::VectorXd p_max_flat = flatten_pairs(sc.graph.p_max, n);

    for (int s = 0; s < n_seeds; ++s) {
        const SeedDraws draws = draw_seed_noise(sc, seed ^ static_cast<uint64_t>(s));

        for (const bool adaptive : {true, false}) {
            FleetState state = initial_fleet_state(sc.initial_idle);
            // Both policies start from the fixed-markup price.
            Eigen::VectorXd p = flatten_pairs(p_fixed, n);
            SlotAccumulator& acc = adaptive ? adaptive_acc : fixed_acc;

            for (int k = 0; k < slots; ++k) {
                Eigen::MatrixXd delta =
                    sc.demand.delta[k].cwiseProduct(draws.demand_factor[k]);
                delta.diagonal().setZero();

                PricingCost pc;
                Eigen::VectorXd y;
                if (adaptive) {
                    pc = build_pricing_cost(sc.graph, delta, sc.rho,
                                            red.lift_map);
                    y = red.diff_map * state.idle;
                }

                const Eigen::MatrixXd prices = unflatten_pairs(p, n);
                const Eigen::MatrixXd d =
                    accepted_demand(sc.graph, delta, prices);
                const double before = state.total_mass();
                FleetStepResult step = fleet_step(state, sc.graph, d,
                                                  draws.travel[k],
                                                  draws.exo[k]);
                if (sc.service_noise == 0.0)
                    cmp.max_conservation_drift = std::max(
                        cmp.max_conservation_drift,
                        std::abs(step.next.total_mass() - before));

                const double accepted = step.served.sum();
                double profit = 0.0;
                double price_weight = 0.0;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        if (i == j) continue;
                        profit += (prices(i, j) - sc.graph.c(i, j)) *
                                  step.served(i, j);
                        price_weight += step.served(i, j) * prices(i, j) /
                                        sc.graph.p_max(i, j);
                    }
                double mean_price;
                if (accepted > 0.0) {
                    mean_price = price_weight / accepted;
                } else {
                    mean_price = (p.cwiseQuotient(p_max_flat)).mean();
                }
                const double utilization = 1.0 - step.next.idle.sum();
                acc.add(k, accepted, profit, mean_price, utilization);

                if (adaptive) {
                    // Chain rule through the known elasticity: steady-state
                    // price-to-difference gain is -G_hat_demand * Lambda_k.
                    ControllerConfig cfg;
                    cfg.eta = eta;
                    cfg.G_hat =
                        -cmp.G_hat_demand * pc.elasticity.asDiagonal();
                    cfg.constraint = pc.price_box;
                    p = projected_step(p, y, cfg, pc.cost, k);
                }
                state = std::move(step.next);
            }
        }
    }

    adaptive_acc.finalize(n_seeds);
    fixed_acc.finalize(n_seeds);
    cmp.adaptive = std::move(adaptive_acc.totals);
    cmp.fixed = std::move(fixed_acc.totals);
    for (int k = 0; k < slots; ++k) {
        cmp.adaptive_cum_profit += cmp.adaptive[k].profit;
        cmp.fixed_cum_profit += cmp.fixed[k].profit;
        cmp.adaptive_cum_accepted += cmp.adaptive[k].accepted;
        cmp.fixed_cum_accepted += cmp.fixed[k].accepted;
    }
    return cmp;
}

}  // namespace dfo
