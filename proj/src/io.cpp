#include "omrr/io.hpp"

#include <fstream>
#include <stdexcept>

namespace omrr::io {

using nlohmann::json;

namespace {

void require_format(const json& doc, const char* tag) {
    if (!doc.is_object() || doc.value("format", "") != tag)
        throw std::invalid_argument(std::string("document is not a ") + tag);
}

json arrivals_to_json(const model::ArrivalProcess& ap) {
    json j;
    switch (ap.mode()) {
        case model::ArrivalProcess::Mode::uniform:
            j["mode"] = "uniform";
            j["rate"] = ap.uniform_rate();
            break;
        case model::ArrivalProcess::Mode::stationary: {
            j["mode"] = "stationary";
            std::vector<double> rates(ap.num_types());
            for (model::TypeId v = 0; v < ap.num_types(); ++v) rates[v] = ap.rate(v, 1);
            j["rates"] = rates;
            break;
        }
        case model::ArrivalProcess::Mode::dense: {
            j["mode"] = "dense";
            std::vector<std::vector<double>> rates(ap.horizon());
            for (model::Round t = 1; t <= ap.horizon(); ++t) {
                rates[t - 1].resize(ap.num_types());
                for (model::TypeId v = 0; v < ap.num_types(); ++v)
                    rates[t - 1][v] = ap.rate(v, t);
            }
            j["rates"] = rates;
            break;
        }
    }
    return j;
}

model::ArrivalProcess arrivals_from_json(const json& j, model::TypeId num_types,
                                         model::Round horizon) {
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "uniform")
        return model::ArrivalProcess::uniform(num_types, horizon,
                                              j.at("rate").get<double>());
    if (mode == "stationary")
        return model::ArrivalProcess::stationary(
            j.at("rates").get<std::vector<double>>(), horizon);
    if (mode == "dense")
        return model::ArrivalProcess::dense(
            j.at("rates").get<std::vector<std::vector<double>>>());
    throw std::invalid_argument("unknown arrival mode '" + mode + "'");
}

json occupation_to_json(const model::OccupationMap& occ) {
    json j;
    j["time_indexed"] = occ.time_indexed();
    json pool = json::array();
    for (const auto& otd : occ.pool()) pool.push_back(otd.probabilities());
    j["pool"] = pool;
    if (occ.time_indexed())
        j["edge_round_otd"] = occ.edge_round_otd();
    else
        j["edge_otd"] = occ.edge_otd();
    return j;
}

model::OccupationMap occupation_from_json(const json& j, model::Round horizon) {
    std::vector<model::OccupationDistribution> pool;
    for (const auto& pmf : j.at("pool"))
        pool.emplace_back(pmf.get<std::vector<double>>());
    if (j.value("time_indexed", false))
        return model::OccupationMap::time_indexed(
            std::move(pool), j.at("edge_round_otd").get<std::vector<std::uint32_t>>(),
            horizon);
    return model::OccupationMap::per_edge(
        std::move(pool), j.at("edge_otd").get<std::vector<std::uint32_t>>());
}

}  // namespace

json instance_to_json(const model::InstanceSpec& spec) {
    json j;
    j["format"] = kInstanceFormat;
    j["resources"] = spec.resources;
    j["request_types"] = spec.request_types;
    j["horizon"] = spec.horizon;
    json edges = json::array();
    for (const auto& e : spec.edges) edges.push_back({e.resource, e.type, e.weight});
    j["edges"] = edges;
    j["arrivals"] = arrivals_to_json(spec.arrivals);
    j["occupation"] = occupation_to_json(spec.occupation);
    return j;
}

model::InstanceSpec instance_from_json(const json& doc) {
    require_format(doc, kInstanceFormat);
    model::InstanceSpec spec;
    spec.resources = doc.at("resources").get<std::vector<std::string>>();
    spec.request_types = doc.at("request_types").get<std::vector<std::string>>();
    spec.horizon = doc.at("horizon").get<model::Round>();
    for (const auto& e : doc.at("edges"))
        spec.edges.push_back({e.at(0).get<model::ResourceId>(),
                              e.at(1).get<model::TypeId>(), e.at(2).get<double>()});
    spec.arrivals = arrivals_from_json(doc.at("arrivals"),
                                       static_cast<model::TypeId>(spec.request_types.size()),
                                       spec.horizon);
    spec.occupation = occupation_from_json(doc.at("occupation"), spec.horizon);
    return spec;
}

json solution_to_json(const lp::LpSolution& sol) {
    json j;
    j["format"] = kSolutionFormat;
    j["num_edges"] = sol.num_edges;
    j["horizon"] = sol.horizon;
    j["time_sensitive"] = sol.time_sensitive;
    j["objective"] = sol.objective;
    j["status"] = solver::to_string(sol.status);
    j["certified_gap"] = sol.certified_gap;
    j["solver_info"] = sol.solver_info;
    json x = json::array();
    for (std::size_t e = 0; e < sol.num_edges; ++e)
        for (model::Round t = 1; t <= sol.horizon; ++t) {
            const double v = sol.at(static_cast<model::EdgeId>(e), t);
            if (v != 0.0) x.push_back({e, t, v});
        }
    j["x"] = x;
    return j;
}

lp::LpSolution solution_from_json(const json& doc) {
    require_format(doc, kSolutionFormat);
    lp::LpSolution sol;
    sol.num_edges = doc.at("num_edges").get<std::size_t>();
    sol.horizon = doc.at("horizon").get<model::Round>();
    sol.time_sensitive = doc.value("time_sensitive", false);
    sol.objective = doc.at("objective").get<double>();
    sol.certified_gap = doc.value("certified_gap", 0.0);
    sol.solver_info = doc.value("solver_info", "");
    const std::string status = doc.value("status", "optimal");
    sol.status = status == "optimal"      ? solver::SolveStatus::optimal
                 : status == "infeasible" ? solver::SolveStatus::infeasible
                                          : solver::SolveStatus::numerical_trouble;
    sol.x.assign(sol.num_edges * sol.horizon, 0.0);
    for (const auto& entry : doc.at("x")) {
        const auto e = entry.at(0).get<std::size_t>();
        const auto t = entry.at(1).get<model::Round>();
        sol.x[e * sol.horizon + (t - 1)] = entry.at(2).get<double>();
    }
    return sol;
}

json model_to_json(const data::TrainedModel& m) {
    json j;
    j["format"] = kModelFormat;
    j["grid"] = {{"origin_lat", m.grid.origin_lat},
                 {"origin_lon", m.grid.origin_lon},
                 {"cell_size", m.grid.cell_size},
                 {"extent_lat", m.grid.extent_lat},
                 {"extent_lon", m.grid.extent_lon}};
    j["horizon"] = m.horizon;
    json types = json::array();
    for (const auto& key : m.types)
        types.push_back({key.pickup.lat, key.pickup.lon, key.dropoff.lat,
                         key.dropoff.lon});
    j["types"] = types;

    json arr;
    arr["days"] = m.arrivals.days;
    arr["rescaled_rounds"] = m.arrivals.rescaled_rounds;
    arr["truncated_trips"] = m.arrivals.truncated_trips;
    arr["kiid_scale"] = m.arrivals.kiid_scale;
    json counts = json::array();
    for (std::size_t v = 0; v < m.types.size(); ++v)
        for (model::Round t = 1; t <= m.horizon; ++t) {
            const auto c = m.arrivals.count(static_cast<std::uint32_t>(v), t);
            if (c) counts.push_back({v, t, c});
        }
    arr["counts"] = counts;
    json scales = json::array();
    for (model::Round t = 1; t <= m.horizon; ++t)
        if (m.arrivals.round_scale[t - 1] != 1.0)
            scales.push_back({t, m.arrivals.round_scale[t - 1]});
    arr["round_scale"] = scales;
    j["arrivals"] = arr;

    auto fit_json = [](const data::OtdFit& fit) {
        return json{{"mean", fit.mean},
                    {"sigma", fit.sigma},
                    {"exponent", fit.exponent},
                    {"samples", fit.samples}};
    };
    j["normal_fit"] = fit_json(m.normal_fit);
    j["power_law_fit"] = fit_json(m.power_law_fit);

    j["cars"] = m.cars;
    json docking = json::array();
    for (const auto& cell : m.docking) docking.push_back({cell.lat, cell.lon});
    j["docking"] = docking;
    j["malformed"] = m.malformed;
    j["out_of_box"] = m.out_of_box;
    return j;
}

data::TrainedModel model_from_json(const json& doc) {
    require_format(doc, kModelFormat);
    data::TrainedModel m;
    const auto& g = doc.at("grid");
    m.grid.origin_lat = g.at("origin_lat").get<double>();
    m.grid.origin_lon = g.at("origin_lon").get<double>();
    m.grid.cell_size = g.at("cell_size").get<double>();
    m.grid.extent_lat = g.at("extent_lat").get<std::int32_t>();
    m.grid.extent_lon = g.at("extent_lon").get<std::int32_t>();
    m.horizon = doc.at("horizon").get<model::Round>();
    for (const auto& key : doc.at("types"))
        m.types.push_back({{key.at(0).get<std::int32_t>(), key.at(1).get<std::int32_t>()},
                           {key.at(2).get<std::int32_t>(), key.at(3).get<std::int32_t>()}});

    const auto& arr = doc.at("arrivals");
    m.arrivals.horizon = m.horizon;
    m.arrivals.days = arr.at("days").get<std::uint32_t>();
    m.arrivals.rescaled_rounds = arr.at("rescaled_rounds").get<std::uint64_t>();
    m.arrivals.truncated_trips = arr.at("truncated_trips").get<std::uint64_t>();
    m.arrivals.kiid_scale = arr.value("kiid_scale", 1.0);
    m.arrivals.counts.assign(m.types.size() * m.horizon, 0);
    for (const auto& entry : arr.at("counts")) {
        const auto v = entry.at(0).get<std::size_t>();
        const auto t = entry.at(1).get<model::Round>();
        m.arrivals.counts[v * m.horizon + (t - 1)] = entry.at(2).get<std::uint32_t>();
    }
    m.arrivals.round_scale.assign(m.horizon, 1.0);
    for (const auto& entry : arr.at("round_scale"))
        m.arrivals.round_scale[entry.at(0).get<model::Round>() - 1] =
            entry.at(1).get<double>();

    auto fit_from = [&](const json& f, data::OtdFamily family) {
        data::OtdFit fit;
        fit.family = family;
        fit.mean = f.at("mean").get<double>();
        fit.sigma = f.at("sigma").get<double>();
        fit.exponent = f.at("exponent").get<double>();
        fit.samples = f.at("samples").get<std::uint64_t>();
        fit.distribution = family == data::OtdFamily::normal
                               ? data::discretized_normal(fit.mean, fit.sigma, m.horizon)
                               : data::power_law(fit.exponent, m.horizon);
        return fit;
    };
    m.normal_fit = fit_from(doc.at("normal_fit"), data::OtdFamily::normal);
    m.power_law_fit = fit_from(doc.at("power_law_fit"), data::OtdFamily::power_law);

    m.cars = doc.at("cars").get<std::vector<std::string>>();
    for (const auto& cell : doc.at("docking"))
        m.docking.push_back({cell.at(0).get<std::int32_t>(),
                             cell.at(1).get<std::int32_t>()});
    m.malformed = doc.value("malformed", std::uint64_t{0});
    m.out_of_box = doc.value("out_of_box", std::uint64_t{0});
    return m;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json doc;
    in >> doc;
    return doc;
}

void save_json(const std::string& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << doc.dump(1, '\t') << '\n';
}

}  // namespace omrr::io
